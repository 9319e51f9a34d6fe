//! The rule-document language: parser, canonical renderer, and compilation
//! into justification frames.
//!
//! Grammar, one statement per `.`:
//!
//! ```text
//! #open a b.            declare open atoms
//! #complement.          complement the one-signed program before validation
//! p <- q, ~r.           rule; literals are `~`-optional identifiers or t|f|u
//! % comment             to end of line
//! ```
//!
//! Identifiers match `[A-Za-z_][A-Za-z0-9_]*`; `t`, `f`, `u` are reserved for
//! the logical facts. In strict mode every body-only atom must be declared
//! open; `ParseOptions::implicit_open` relaxes this.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::frame::{complementation, FrameError, JustificationFrame, Rule};
use crate::lattice::{Fact, FactSpace, Interpretation, LatticeError, TruthValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Literal {
    Logical(TruthValue),
    Atom { name: String, negated: bool },
}

impl Literal {
    pub fn atom(name: impl Into<String>, negated: bool) -> Self {
        Literal::Atom {
            name: name.into(),
            negated,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Literal::Logical(v) => v.symbol().to_string(),
            Literal::Atom { name, negated } => {
                if *negated {
                    format!("~{name}")
                } else {
                    name.clone()
                }
            }
        }
    }

    pub fn atom_name(&self) -> Option<&str> {
        match self {
            Literal::Logical(_) => None,
            Literal::Atom { name, .. } => Some(name),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// A rule statement. Bodies are canonicalized at parse time: sorted by
/// rendered literal and deduplicated.
#[derive(Debug, Clone, Eq)]
pub struct RuleStatement {
    pub head: Literal,
    pub body: Vec<Literal>,
    pub span: Span,
}

// Spans are layout, not identity.
impl PartialEq for RuleStatement {
    fn eq(&self, other: &Self) -> bool {
        self.head == other.head && self.body == other.body
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RuleDocument {
    /// Declared open atoms, in declaration order, deduplicated.
    pub open_atoms: Vec<String>,
    pub auto_complement: bool,
    pub statements: Vec<RuleStatement>,
}

impl RuleDocument {
    /// Canonical text: directives first, open atoms in declaration order,
    /// statements in source order with sorted bodies. `parse(render(doc))`
    /// reproduces `doc`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.auto_complement {
            out.push_str("#complement.\n");
        }
        if !self.open_atoms.is_empty() {
            out.push_str(&format!("#open {}.\n", self.open_atoms.join(" ")));
        }
        for statement in &self.statements {
            let body: Vec<String> = statement.body.iter().map(Literal::render).collect();
            out.push_str(&format!(
                "{} <- {}.\n",
                statement.head.render(),
                body.join(", ")
            ));
        }
        out
    }

    pub fn atom_names(&self) -> BTreeSet<String> {
        let mut names: BTreeSet<String> = self.open_atoms.iter().cloned().collect();
        for statement in &self.statements {
            names.extend(statement.head.atom_name().map(str::to_string));
            for literal in &statement.body {
                names.extend(literal.atom_name().map(str::to_string));
            }
        }
        names
    }

    pub fn head_atom_names(&self) -> BTreeSet<String> {
        self.statements
            .iter()
            .filter_map(|s| s.head.atom_name().map(str::to_string))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ParseOptions {
    /// Treat undeclared body-only atoms as open instead of erroring.
    pub implicit_open: bool,
}

pub fn parse_rule_document(text: &str) -> Result<RuleDocument, ParseError> {
    parse_rule_document_with(text, ParseOptions::default())
}

pub fn parse_rule_document_with(
    text: &str,
    options: ParseOptions,
) -> Result<RuleDocument, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens,
        position: 0,
    };
    let mut document = RuleDocument::default();
    let mut open_decls: Vec<(String, Span)> = Vec::new();

    while !parser.at_end() {
        match parser.peek().cloned() {
            Some(Token {
                kind: TokenKind::Directive(name),
                span,
            }) => {
                parser.advance();
                match name.as_str() {
                    "open" => {
                        while let Some(Token {
                            kind: TokenKind::Ident(atom),
                            span,
                        }) = parser.peek().cloned()
                        {
                            parser.advance();
                            if is_reserved(&atom) {
                                return Err(ParseError::new(span, ParseErrorKind::ReservedName(atom)));
                            }
                            open_decls.push((atom, span));
                        }
                        parser.expect_dot()?;
                    }
                    "complement" => {
                        parser.expect_dot()?;
                        document.auto_complement = true;
                    }
                    other => {
                        return Err(ParseError::new(
                            span,
                            ParseErrorKind::UnknownDirective(other.to_string()),
                        ))
                    }
                }
            }
            Some(_) => {
                let statement = parser.rule_statement()?;
                document.statements.push(statement);
            }
            None => break,
        }
    }

    let heads = document.head_atom_names();
    for (atom, span) in &open_decls {
        if heads.contains(atom) {
            return Err(ParseError::new(
                *span,
                ParseErrorKind::OpenDeclaredDefined(atom.clone()),
            ));
        }
        if !document.open_atoms.contains(atom) {
            document.open_atoms.push(atom.clone());
        }
    }

    if !options.implicit_open {
        let declared: BTreeSet<&String> = document.open_atoms.iter().collect();
        for statement in &document.statements {
            for literal in &statement.body {
                if let Some(name) = literal.atom_name() {
                    if !heads.contains(name) && !declared.contains(&name.to_string()) {
                        return Err(ParseError::new(
                            statement.span,
                            ParseErrorKind::UndeclaredAtom(name.to_string()),
                        ));
                    }
                }
            }
        }
    }

    Ok(document)
}

/// Parses a standalone literal such as `p`, `~p`, or `t`.
pub fn parse_literal(text: &str) -> Option<Literal> {
    let (negated, name) = match text.strip_prefix('~') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let mut chars = name.chars();
    let first = chars.next()?;
    if !(first.is_ascii_alphabetic() || first == '_') {
        return None;
    }
    if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return None;
    }
    if is_reserved(name) {
        let value = TruthValue::from_symbol(name.chars().next()?)?;
        let fact = if negated { value.negate() } else { value };
        return Some(Literal::Logical(fact));
    }
    Some(Literal::atom(name, negated))
}

/// Resolves a document into its universe and literal rule set, before any
/// complementation or validation.
pub fn document_rules(document: &RuleDocument) -> (FactSpace, Vec<Rule>) {
    let space = FactSpace::new(document.atom_names());
    let to_fact = |literal: &Literal| -> Fact {
        match literal {
            Literal::Logical(v) => Fact::Logical(*v),
            Literal::Atom { name, negated } => {
                let id = space.atom(name).expect("collected atom");
                if *negated {
                    Fact::negative(id)
                } else {
                    Fact::positive(id)
                }
            }
        }
    };
    let rules = document
        .statements
        .iter()
        .map(|s| Rule::new(to_fact(&s.head), s.body.iter().map(to_fact)))
        .collect();
    (space, rules)
}

/// Compiles a document into a validated frame. Defined atoms are exactly the
/// head atoms; everything else in the universe is open. The `#complement.`
/// directive applies complementation before validation and rejects programs
/// defining both signs of an atom.
pub fn compile_document(
    document: &RuleDocument,
    selection_cap: u64,
) -> Result<JustificationFrame, FrameError> {
    let (space, mut rules) = document_rules(document);
    if document.auto_complement {
        rules = complementation(&space, &rules, selection_cap)?;
    }
    let defined = rules.iter().filter_map(|r| r.head().atom()).collect();
    JustificationFrame::new(space, defined, rules)
}

/// Renders a frame back into a document: open atoms declared explicitly,
/// rules in the frame's canonical order.
pub fn document_from_frame(frame: &JustificationFrame) -> RuleDocument {
    let space = frame.space();
    let to_literal = |fact: Fact| -> Literal {
        match fact {
            Fact::Logical(v) => Literal::Logical(v),
            Fact::Atom(id, sign) => Literal::atom(
                space.name(id),
                sign == crate::lattice::Sign::Negative,
            ),
        }
    };
    let statements = frame
        .rules()
        .iter()
        .map(|rule| {
            let mut body: Vec<Literal> = rule.body().iter().map(|&x| to_literal(x)).collect();
            body.sort_by_key(Literal::render);
            RuleStatement {
                head: to_literal(rule.head()),
                body,
                span: Span::default(),
            }
        })
        .collect();
    RuleDocument {
        open_atoms: frame
            .open_atoms()
            .into_iter()
            .map(|id| space.name(id).to_string())
            .collect(),
        auto_complement: false,
        statements,
    }
}

/// Parses an interpretation file: whitespace-separated `atom=value` tokens,
/// atoms positive only, values in `{t, f, u}`, covering every atom of the
/// universe.
pub fn parse_interpretation(
    text: &str,
    space: &FactSpace,
) -> Result<Interpretation, InterpretationError> {
    let mut pairs: Vec<(Fact, TruthValue)> = Vec::new();
    for (line_index, line) in text.lines().enumerate() {
        let line_no = line_index as u32 + 1;
        let content = line.split('%').next().unwrap_or("");
        let mut col = 1u32;
        for token in content.split_whitespace() {
            // Recover the real column of this token.
            let offset = content[(col - 1) as usize..]
                .find(token)
                .map(|o| o + (col - 1) as usize)
                .unwrap_or(0);
            col = offset as u32 + 1;
            let token_error = |message: String| InterpretationError::Token {
                line: line_no,
                col,
                message,
            };
            let (name, value) = token
                .split_once('=')
                .ok_or_else(|| token_error(format!("expected `atom=value`, found `{token}`")))?;
            if name.starts_with('~') {
                return Err(InterpretationError::Lattice(LatticeError::NegativeKey(
                    name.to_string(),
                )));
            }
            if is_reserved(name) {
                return Err(InterpretationError::Lattice(LatticeError::LogicalKey(
                    name.to_string(),
                )));
            }
            let id = space
                .atom(name)
                .ok_or_else(|| token_error(format!("unknown atom `{name}`")))?;
            let value = match (value.len(), value.chars().next()) {
                (1, Some(c)) => TruthValue::from_symbol(c),
                _ => None,
            }
            .ok_or_else(|| token_error(format!("value must be one of t, f, u; found `{value}`")))?;
            pairs.push((Fact::positive(id), value));
            col += token.len() as u32;
        }
    }
    Interpretation::from_pairs(space, pairs).map_err(InterpretationError::Lattice)
}

fn is_reserved(name: &str) -> bool {
    matches!(name, "t" | "f" | "u")
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum TokenKind {
    Ident(String),
    Directive(String),
    Tilde,
    Arrow,
    Comma,
    Dot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Token {
    kind: TokenKind,
    span: Span,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let mut line = 1u32;
    let mut col = 1u32;

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                bump!();
            }
            '%' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '~' => {
                bump!();
                tokens.push(Token {
                    kind: TokenKind::Tilde,
                    span,
                });
            }
            ',' => {
                bump!();
                tokens.push(Token {
                    kind: TokenKind::Comma,
                    span,
                });
            }
            '.' => {
                bump!();
                tokens.push(Token {
                    kind: TokenKind::Dot,
                    span,
                });
            }
            '<' => {
                bump!();
                match chars.peek() {
                    Some('-') => {
                        bump!();
                        tokens.push(Token {
                            kind: TokenKind::Arrow,
                            span,
                        });
                    }
                    _ => return Err(ParseError::new(span, ParseErrorKind::UnexpectedChar('<'))),
                }
            }
            '#' => {
                bump!();
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Directive(name),
                    span,
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        bump!();
                    } else {
                        break;
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(name),
                    span,
                });
            }
            other => return Err(ParseError::new(span, ParseErrorKind::UnexpectedChar(other))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    position: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.position >= self.tokens.len()
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.position)
    }

    fn advance(&mut self) -> Option<&Token> {
        let token = self.tokens.get(self.position);
        self.position += 1;
        token
    }

    fn end_span(&self) -> Span {
        self.tokens
            .last()
            .map(|t| t.span)
            .unwrap_or(Span { line: 1, col: 1 })
    }

    fn found(&self) -> String {
        match self.peek() {
            Some(token) => match &token.kind {
                TokenKind::Ident(name) => format!("`{name}`"),
                TokenKind::Directive(name) => format!("`#{name}`"),
                TokenKind::Tilde => "`~`".to_string(),
                TokenKind::Arrow => "`<-`".to_string(),
                TokenKind::Comma => "`,`".to_string(),
                TokenKind::Dot => "`.`".to_string(),
            },
            None => "end of input".to_string(),
        }
    }

    fn expect_dot(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Dot,
                ..
            }) => {
                self.advance();
                Ok(())
            }
            Some(token) => Err(ParseError::new(
                token.span,
                ParseErrorKind::Expected {
                    expected: "`.`",
                    found: self.found(),
                },
            )),
            None => Err(ParseError::new(
                self.end_span(),
                ParseErrorKind::Expected {
                    expected: "`.`",
                    found: "end of input".to_string(),
                },
            )),
        }
    }

    fn literal(&mut self) -> Result<(Literal, Span), ParseError> {
        let negated = matches!(
            self.peek(),
            Some(Token {
                kind: TokenKind::Tilde,
                ..
            })
        );
        let tilde_span = self.peek().map(|t| t.span);
        if negated {
            self.advance();
        }
        match self.peek().cloned() {
            Some(Token {
                kind: TokenKind::Ident(name),
                span,
            }) => {
                self.advance();
                let span = if negated {
                    tilde_span.unwrap_or(span)
                } else {
                    span
                };
                if is_reserved(&name) {
                    let value = TruthValue::from_symbol(name.chars().next().expect("nonempty"))
                        .expect("reserved names are logical symbols");
                    let value = if negated { value.negate() } else { value };
                    Ok((Literal::Logical(value), span))
                } else {
                    Ok((Literal::atom(name, negated), span))
                }
            }
            Some(token) => Err(ParseError::new(
                token.span,
                ParseErrorKind::Expected {
                    expected: "a literal",
                    found: self.found(),
                },
            )),
            None => Err(ParseError::new(
                self.end_span(),
                ParseErrorKind::Expected {
                    expected: "a literal",
                    found: "end of input".to_string(),
                },
            )),
        }
    }

    fn rule_statement(&mut self) -> Result<RuleStatement, ParseError> {
        let (head, span) = self.literal()?;
        if matches!(head, Literal::Logical(_)) {
            return Err(ParseError::new(span, ParseErrorKind::LogicalHead));
        }
        match self.peek() {
            Some(Token {
                kind: TokenKind::Arrow,
                ..
            }) => {
                self.advance();
            }
            _ => {
                let found = self.found();
                let at = self.peek().map(|t| t.span).unwrap_or_else(|| self.end_span());
                return Err(ParseError::new(
                    at,
                    ParseErrorKind::Expected {
                        expected: "`<-`",
                        found,
                    },
                ));
            }
        }
        if matches!(
            self.peek(),
            Some(Token {
                kind: TokenKind::Dot,
                ..
            })
        ) {
            let at = self.peek().map(|t| t.span).expect("peeked");
            return Err(ParseError::new(at, ParseErrorKind::EmptyBody));
        }
        let mut body = vec![self.literal()?.0];
        while matches!(
            self.peek(),
            Some(Token {
                kind: TokenKind::Comma,
                ..
            })
        ) {
            self.advance();
            body.push(self.literal()?.0);
        }
        self.expect_dot()?;
        body.sort_by_key(Literal::render);
        body.dedup();
        Ok(RuleStatement { head, body, span })
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn new(span: Span, kind: ParseErrorKind) -> Self {
        ParseError {
            line: span.line,
            col: span.col,
            kind,
        }
    }

    pub fn span(&self) -> Span {
        Span {
            line: self.line,
            col: self.col,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    Expected { expected: &'static str, found: String },
    LogicalHead,
    EmptyBody,
    UnknownDirective(String),
    ReservedName(String),
    UndeclaredAtom(String),
    OpenDeclaredDefined(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::Expected { expected, found } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::LogicalHead => write!(f, "rule head is a logical fact"),
            ParseErrorKind::EmptyBody => write!(f, "empty rule body"),
            ParseErrorKind::UnknownDirective(name) => write!(f, "unknown directive `#{name}`"),
            ParseErrorKind::ReservedName(name) => {
                write!(f, "`{name}` is a logical fact and cannot be declared open")
            }
            ParseErrorKind::UndeclaredAtom(name) => write!(
                f,
                "atom `{name}` appears only in bodies and is not declared open"
            ),
            ParseErrorKind::OpenDeclaredDefined(name) => {
                write!(f, "atom `{name}` is declared open but defined by rules")
            }
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InterpretationError {
    #[error("{line}:{col}: {message}")]
    Token { line: u32, col: u32, message: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::DEFAULT_SELECTION_CAP;

    const EXAMPLE_DOC: &str = "#open q r.\np <- q, ~r.\n~p <- ~q.\n";

    #[test]
    fn parses_the_example_document() {
        let doc = parse_rule_document(EXAMPLE_DOC).unwrap();
        assert_eq!(doc.open_atoms, vec!["q", "r"]);
        assert!(!doc.auto_complement);
        assert_eq!(doc.statements.len(), 2);
        assert_eq!(doc.statements[0].head, Literal::atom("p", false));
        assert_eq!(
            doc.statements[0].body,
            vec![Literal::atom("q", false), Literal::atom("r", true)]
        );
        assert_eq!(doc.statements[1].head, Literal::atom("p", true));
        assert_eq!(doc.statements[0].span, Span { line: 2, col: 1 });
    }

    #[test]
    fn parses_the_empty_document() {
        let doc = parse_rule_document("").unwrap();
        assert_eq!(doc, RuleDocument::default());
    }

    #[test]
    fn rejects_an_empty_body() {
        let err = parse_rule_document("p <- .").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::EmptyBody);
        assert_eq!((err.line, err.col), (1, 6));
    }

    #[test]
    fn rejects_logical_heads_and_unknown_directives() {
        let err = parse_rule_document("t <- p.").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::LogicalHead);

        let err = parse_rule_document("#foo.").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownDirective("foo".into()));
    }

    #[test]
    fn strict_mode_catches_undeclared_atoms() {
        let err = parse_rule_document("p <- q.\n~p <- ~q.").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UndeclaredAtom("q".into()));

        let doc = parse_rule_document_with(
            "p <- q.\n~p <- ~q.",
            ParseOptions {
                implicit_open: true,
            },
        )
        .unwrap();
        assert_eq!(doc.statements.len(), 2);
    }

    #[test]
    fn rejects_open_declaration_of_a_defined_atom() {
        let err = parse_rule_document("#open p q.\np <- q.\n~p <- ~q.").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::OpenDeclaredDefined("p".into()));
    }

    #[test]
    fn comments_and_duplicate_opens() {
        let doc = parse_rule_document(
            "% header\n#open q. % trailing\n#open q r.\np <- q. % rule\n~p <- ~r.\n",
        )
        .unwrap();
        assert_eq!(doc.open_atoms, vec!["q", "r"]);
        assert_eq!(doc.statements.len(), 2);
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_rule_document("p <- q\n~p <- ~q.").unwrap_err();
        assert_eq!((err.line, err.col), (2, 1));
        assert!(matches!(err.kind, ParseErrorKind::Expected { .. }));

        let err = parse_rule_document("p ? q.").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnexpectedChar('?'));
        assert_eq!((err.line, err.col), (1, 3));
    }

    #[test]
    fn render_parse_round_trip_is_identity() {
        let inputs = [
            EXAMPLE_DOC,
            "",
            "#complement.\n#open o.\np <- ~p, o, t.\n",
            "x <- t.\n~x <- t.\n",
            "#open b a.\nz <- b, a, a.\n~z <- f.\n",
        ];
        for input in inputs {
            let doc = parse_rule_document(input).unwrap();
            let rendered = doc.render();
            let reparsed = parse_rule_document(&rendered).unwrap();
            assert_eq!(doc, reparsed, "round trip changed the AST for {input:?}");
            assert_eq!(rendered, reparsed.render());
        }
    }

    #[test]
    fn render_canonicalizes_bodies() {
        let doc = parse_rule_document("#open q r.\np <- ~r, q, q.\n~p <- ~q.\n").unwrap();
        assert_eq!(
            doc.render(),
            "#open q r.\np <- q, ~r.\n~p <- ~q.\n"
        );
    }

    #[test]
    fn complement_directive_expands_before_validation() {
        let doc = parse_rule_document("#complement.\n#open q r.\np <- q, ~r.\n").unwrap();
        let frame = compile_document(&doc, DEFAULT_SELECTION_CAP).unwrap();
        let rendered: Vec<String> = frame
            .rules()
            .iter()
            .map(|r| r.render(frame.space()))
            .collect();
        assert_eq!(rendered, vec!["p <- q, ~r", "~p <- ~q", "~p <- r"]);

        let mixed = parse_rule_document("#complement.\np <- t.\n~p <- f.\n").unwrap();
        assert!(matches!(
            compile_document(&mixed, DEFAULT_SELECTION_CAP),
            Err(FrameError::MixedSigns { atom }) if atom == "p"
        ));
    }

    #[test]
    fn compile_validates_the_frame() {
        let doc = parse_rule_document("#open q.\np <- q.\n").unwrap();
        let err = compile_document(&doc, DEFAULT_SELECTION_CAP).unwrap_err();
        assert!(matches!(err, FrameError::Invalid(_)));
    }

    #[test]
    fn document_round_trips_through_a_frame() {
        let doc = parse_rule_document("#complement.\n#open q r.\np <- q, ~r.\n").unwrap();
        let frame = compile_document(&doc, DEFAULT_SELECTION_CAP).unwrap();
        let back = document_from_frame(&frame);
        assert_eq!(back.open_atoms, vec!["q", "r"]);
        assert_eq!(
            back.render(),
            "#open q r.\np <- q, ~r.\n~p <- ~q.\n~p <- r.\n"
        );
        let recompiled = compile_document(&back, DEFAULT_SELECTION_CAP).unwrap();
        assert_eq!(recompiled, frame);
    }

    #[test]
    fn interpretation_parsing() {
        let space = FactSpace::new(["p", "q"]);
        let interp = parse_interpretation("p=t q=u", &space).unwrap();
        assert_eq!(interp.render(&space), "p=t q=u");

        let err = parse_interpretation("p=t ~q=f", &space).unwrap_err();
        assert!(matches!(
            err,
            InterpretationError::Lattice(LatticeError::NegativeKey(_))
        ));

        let err = parse_interpretation("p=t", &space).unwrap_err();
        assert!(matches!(
            err,
            InterpretationError::Lattice(LatticeError::MissingAtom(name)) if name == "q"
        ));

        let err = parse_interpretation("p=t q=x", &space).unwrap_err();
        assert!(matches!(err, InterpretationError::Token { line: 1, .. }));

        let err = parse_interpretation("p=t r=f q=u", &space).unwrap_err();
        assert!(matches!(err, InterpretationError::Token { .. }));
    }

    #[test]
    fn parse_literal_forms() {
        assert_eq!(parse_literal("p"), Some(Literal::atom("p", false)));
        assert_eq!(parse_literal("~p"), Some(Literal::atom("p", true)));
        assert_eq!(parse_literal("t"), Some(Literal::Logical(TruthValue::True)));
        assert_eq!(
            parse_literal("~t"),
            Some(Literal::Logical(TruthValue::False))
        );
        assert_eq!(parse_literal("2x"), None);
        assert_eq!(parse_literal(""), None);
    }
}
